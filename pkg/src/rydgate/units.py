"""Unit conversions between laboratory units and internal SI units.

All frequencies are stored internally as angular frequencies in rad/s.
A quantity quoted as "5 MHz" at the interface means 2*pi*5e6 rad/s, i.e.
the 2*pi factor is always applied when converting from cyclic-frequency
units.  Times are stored in seconds.
"""

from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi


def khz(value: float) -> float:
    """Cyclic kHz -> rad/s."""
    return TWO_PI * 1e3 * value


def mhz(value: float) -> float:
    """Cyclic MHz -> rad/s."""
    return TWO_PI * 1e6 * value


def ghz(value: float) -> float:
    """Cyclic GHz -> rad/s."""
    return TWO_PI * 1e9 * value


def rad_per_s_to_mhz(value: float) -> float:
    """rad/s -> cyclic MHz."""
    return value / (TWO_PI * 1e6)


def ns(value: float) -> float:
    """Nanoseconds -> seconds."""
    return 1e-9 * value


def us(value: float) -> float:
    """Microseconds -> seconds."""
    return 1e-6 * value


def s_to_us(value: float) -> float:
    """Seconds -> microseconds."""
    return 1e6 * value
