import xml.etree.ElementTree as ET

import pytest

from multispread.engine import ExperimentConfig, InitialStates, perform_propagation
from multispread.logger import EpochSnapshot, ExperimentLog, report_files, to_csv, to_svg, write_report
from multispread.model import ModelBuilder
from multispread.net import duplicate_to_layers, flat_edges

from conftest import epidemic_model

SVG_NS = "{http://www.w3.org/2000/svg}"
INITIAL = {
    "ill": InitialStates({"s": 65, "i": 10, "r": 2}),
    "aware": InitialStates({"n": 67, "a": 10}),
    "vacc": InitialStates({"u": 75, "v": 2}),
}


@pytest.fixture(scope="module")
def run(lesmis):
    net = duplicate_to_layers(flat_edges(lesmis), ["ill", "aware", "vacc"])
    return net, perform_propagation(net, epidemic_model(), ExperimentConfig(20, 42, INITIAL))


def test_csv_header_and_first_row(run):
    _, log = run
    lines = to_csv(log, "ill").split("\n")
    assert lines[0] == "epoch,s,i,r"
    assert lines[1] == "0,65,10,2"
    assert lines[-1] == ""
    assert len(lines) - 1 == log.epochs + 2


def test_csv_rows_conserve_membership(run):
    net, log = run
    for process in log.processes:
        members = len(net.layers[process].members)
        for line in to_csv(log, process).splitlines()[1:]:
            epoch, *counts = map(int, line.split(","))
            assert all(c >= 0 for c in counts)
            assert sum(counts) == members


def test_zero_weight_single_epoch_rows_identical(run):
    net, _ = run
    model = ModelBuilder().add_process("ill", ["s", "i", "r"]).add_process("aware", ["n", "a"]) \
        .add_process("vacc", ["u", "v"]).compile(None)
    log = perform_propagation(net, model, ExperimentConfig(1, 0, INITIAL))
    rows = to_csv(log, "ill").splitlines()
    assert rows[1].split(",")[1:] == rows[2].split(",")[1:]


def test_csv_unknown_process(run):
    with pytest.raises(KeyError):
        to_csv(run[1], "nope")


def test_svg_structure(run):
    _, log = run
    root = ET.fromstring(to_svg(log, "ill"))
    assert root.tag == SVG_NS + "svg"
    assert (root.get("width"), root.get("height")) == ("800", "600")
    lines = root.findall(f".//{SVG_NS}polyline")
    assert [l.get("data-label") for l in lines] == ["s", "i", "r"]
    assert all(len(l.get("points").split()) == log.epochs + 1 for l in lines)
    legend = [t.text for t in root.find(f"{SVG_NS}g[@class='legend']").iter(SVG_NS + "text")]
    assert legend == ["s", "i", "r"]


def test_write_report_bundle(run, tmp_path):
    _, log = run
    written = write_report(log, tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == report_files(log) == sorted([
        "aware_propagation.csv", "ill_propagation.csv", "vacc_propagation.csv",
        "aware_dynamics.svg", "ill_dynamics.svg", "vacc_dynamics.svg",
        "model_report.txt", "network_report.txt",
    ])
    net_report = (tmp_path / "out" / "network_report.txt").read_text()
    assert "ill,77,254" in net_report
    assert (tmp_path / "out" / "model_report.txt").read_text() == log.model_report


def test_write_report_epoch_zero(run, tmp_path):
    net, _ = run
    log = perform_propagation(net, epidemic_model(), ExperimentConfig(0, 1, INITIAL))
    write_report(log, tmp_path)
    assert (tmp_path / "ill_propagation.csv").read_text().count("\n") == 2


def test_empty_log_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_report(ExperimentLog({"ill": ("s", "i")}), tmp_path)


def test_snapshots_must_be_contiguous():
    log = ExperimentLog({"ill": ("s", "i")})
    log.append(EpochSnapshot(0, {"ill": {"s": 1, "i": 0}}))
    with pytest.raises(ValueError):
        log.append(EpochSnapshot(2, {"ill": {"s": 1, "i": 0}}))
