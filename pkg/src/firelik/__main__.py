import sys

from firelik.cli import main

sys.exit(main())
