# -*- coding: utf-8 -*-
"""
离散参数估计根包

公开接口：
- `__version__`：工具版本号，写入每个输出产物

内部方法：
- 无

说明：
- 子包按职责划分：model（参数空间与模型族）、estimator（估计量）、
  llr（似然比过程与对数矩母函数）、rates（大偏差指数）、
  asymptotics（渐近近似）、bounds（信息不等式下界）、
  verify（枚举 / 蒙特卡洛 / 闭式解）、cli（命令行入口）。
"""

__version__ = "0.3.0"
