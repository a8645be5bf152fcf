import sys

from cohomolab.cli import main

sys.exit(main())
