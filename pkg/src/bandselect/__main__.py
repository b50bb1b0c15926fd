import sys

from bandselect.cli import main

sys.exit(main())
