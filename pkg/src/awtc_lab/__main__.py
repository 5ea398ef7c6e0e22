import sys

from awtc_lab.cli import main

sys.exit(main())
