#!/usr/bin/env python3
"""
Cognitive radar revealed-preference toolkit - command-line entry point.

    python cogradar.py simulate --scenario beam --seed 7 --out outputs/beam
    python cogradar.py test outputs/beam/dataset.csv --out outputs/beam
    python cogradar.py reproduce all --quick
"""
import sys

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())
