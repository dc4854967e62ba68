# Root conftest: makes the projcone package importable without installation
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
