import sys

from quasirecon.cli import main


sys.exit(main())
