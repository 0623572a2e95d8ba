import sys

from multispread.cli import main

sys.exit(main())
