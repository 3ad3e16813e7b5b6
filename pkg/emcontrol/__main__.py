import sys

from emcontrol.harness.cli import main


sys.exit(main())
