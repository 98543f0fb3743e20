"""First-return map of a standard neighbourhood of a saddle closed orbit.

The neighbourhood is ``[1, 3] x S^1 x [-1, 1]`` with coordinates
``(rho, alpha, z)``.  Trajectories enter through the side walls ``rho = 1``
and ``rho = 3`` and leave through the lids ``z = +1`` and ``z = -1``.  A point
entering at ``(2 -/+ 1, alpha, z)`` leaves at
``(2 -/+ |z|, alpha + ln|z|, sign z)``; points with ``z = 0`` lie on the
stable manifold and never leave.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, NoReturnError

__all__ = ["TorusPoint", "first_return", "normalized_angle"]


class TorusPoint(NamedTuple):
    rho: float
    alpha: float  # radians, not reduced mod 2*pi
    z: float


def first_return(p: TorusPoint, twisted: bool = False) -> TorusPoint:
    """Image of an incoming boundary point under the flow through the handle.

    With ``twisted=True`` the output is composed with the central symmetry
    ``(alpha, z) -> (alpha + pi, -z)`` that glues a twisted neighbourhood.
    """
    rho, alpha, z = p
    if rho == 1:
        side = -1.0
    elif rho == 3:
        side = 1.0
    else:
        raise DomainError(f"incoming points have rho in {{1, 3}}, got {rho!r}")
    if not -1 < z < 1:
        raise DomainError(f"incoming points have |z| < 1, got {z!r}")
    if z == 0:
        raise NoReturnError("point lies on the stable manifold (z = 0)")
    az = abs(z)
    out = TorusPoint(2.0 + side * az, alpha + math.log(az), math.copysign(1.0, z))
    if twisted:
        out = TorusPoint(out.rho, out.alpha + math.pi, -out.z)
    return out


def normalized_angle(alpha: float) -> float:
    """Reduce an angle to ``[0, 2*pi)``."""
    return alpha % (2 * math.pi)
