# app.py
"""
Root launcher for the workbench command tree.

    python app.py --help
    python app.py graph classes --catalog full:3
    python app.py demo z2-atoms --n 3
"""
import sys

from src.cli.main import run

if __name__ == "__main__":
    sys.exit(run())
