"""Timings of the three pipeline steps and expression sizes, per order l.

Absolute numbers depend on the machine; the shape is the point: step 1
(building the exponential moments) carries most of the cost as l grows.
"""
import sys

from absentminded.cli import main

sys.exit(main(["bench", "--lmax", "8", "--k", "3"]))
