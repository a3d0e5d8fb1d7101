import sys

from homsvm.cli import main

sys.exit(main())
