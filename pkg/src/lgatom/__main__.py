import sys

from lgatom.cli import main

sys.exit(main())
