#!/usr/bin/env python3
"""
projcone - command line wrapper

This is a thin CLI wrapper that imports functionality from the projcone package.
"""

import sys
from pathlib import Path

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from projcone.cli.main import main


if __name__ == "__main__":
    sys.exit(main())
