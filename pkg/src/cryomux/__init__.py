"""Simulation and analysis toolkit for multiplexed cryogenic microwave
resonator characterisation.

Subpackages cover two-port network algebra (``rfnet``), a cryo-CMOS switch
multiplexer model (``muxsim``), dispersively filtered resonator physics
(``resonator``), dielectric loss budgeting (``lossbudget``), estimation
routines (``fitkit``) and measurement-chain synthesis plus the command line
front end (``chain``, ``cli``).
"""

__version__ = "0.1.0"
