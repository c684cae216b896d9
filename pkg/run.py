#!/usr/bin/env python
"""
run.py - Root runner for the kernel_mi command line (src/ layout)
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from kernel_mi.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
