import sys

from crossnet.cli import main

sys.exit(main())
