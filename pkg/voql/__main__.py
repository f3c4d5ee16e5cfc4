"""
Run the `voql` command line interface with `python -m voql`.
"""

import sys

from .harness.cli import main

sys.exit(main())
