import sys

from collective_dephasing.cli import main

sys.exit(main())
