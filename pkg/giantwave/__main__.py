import sys

from giantwave.cli.handler import main

sys.exit(main())
