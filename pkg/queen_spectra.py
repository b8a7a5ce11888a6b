"""
Queen-Spectra launcher
======================

Usage:
    python queen_spectra.py spectrum --n 5 --method both --format json
    python queen_spectra.py verify --n 5 7 11
    python queen_spectra.py orbits --n 5
    python queen_spectra.py scan --range 4..12
    python queen_spectra.py graph --n 5 --out edges.txt
"""

import sys
from pathlib import Path

# Setup paths
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
