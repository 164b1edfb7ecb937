"""
Точка входа SharkTower.

    python run.py orbits --map tent --period 3
    python run.py tower --map example_g --orbit 0,1/2,1 --layer2 2 --layer3 1
    python run.py verify --quick
"""
import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
