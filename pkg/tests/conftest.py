import sys
from pathlib import Path

# make the test-local helper modules (util, oracles) importable
sys.path.insert(0, str(Path(__file__).parent))
