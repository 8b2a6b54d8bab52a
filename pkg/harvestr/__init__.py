"""
Harvestr - A command line tool for railway return-current energy harvesting

This package models a ferrite-rod coil placed beside a track:
- Magnetic field of the rail return current
- Open-circuit voltage and matched-load power of the coil
- Daily energy budgets over a train timetable
- Recorded trace analysis and bench model fitting
"""

__version__ = "0.1.0"
