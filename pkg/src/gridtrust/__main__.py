import sys

from gridtrust.cli import main

sys.exit(main())
