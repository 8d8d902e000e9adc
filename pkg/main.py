"""
pclp: probabilistic constraint logic programming.

Usage:
python main.py eval
python main.py induce --program programs/agree.pclp --corpus programs/agree.qry --depth 5
"""

import sys

from pclp.cli import main

if __name__ == "__main__":
    sys.exit(main())
