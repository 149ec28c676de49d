import sys

from .xcli.cli import main

sys.exit(main())
