import sys

from kpoly.cli import main

sys.exit(main())
