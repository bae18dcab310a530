#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
离散参数估计命令行

用法：
- python scripts/discrete_param.py example gaussian --n 4 --reps 200000 --seed 7
- python scripts/discrete_param.py analyze --model data/tumor.json --truth 2
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent.parent))

from src.estimation.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
