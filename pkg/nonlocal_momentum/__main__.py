import sys

from nonlocal_momentum.cli import main

sys.exit(main())
