"""Natural-unit conversions and physical constants.

Internally everything is Lorentz-Heaviside natural units with hbar = c = 1:
energies in eV, lengths and times in 1/eV, speeds dimensionless, and the
elementary charge e = sqrt(4 pi alpha). Laboratory units (nm, eV, volts)
appear only at the I/O boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Constants",
    "CONSTANTS",
    "length_to_natural",
    "natural_to_length",
    "speed_from_kinetic",
    "kinetic_from_speed",
    "charge_natural",
]


@dataclass(frozen=True)
class Constants:
    """Fixed CODATA-2018 values; frozen so golden tests are bit-stable."""

    hbar_c_eV_nm: float = 197.3269804
    alpha: float = 1.0 / 137.035999
    electron_mass_eV: float = 510998.95

    @property
    def elementary_charge_natural(self) -> float:
        """e in Lorentz-Heaviside natural units: sqrt(4 pi alpha) ~ 0.302822."""
        return math.sqrt(4.0 * math.pi * self.alpha)


CONSTANTS = Constants()


def length_to_natural(length_nm: float, constants: Constants = CONSTANTS) -> float:
    """Convert a laboratory length in nm to natural units (1/eV)."""
    if not length_nm > 0.0:
        raise DomainError(f"length must be positive, got {length_nm!r} nm")
    return length_nm / constants.hbar_c_eV_nm


def natural_to_length(length_inv_eV: float, constants: Constants = CONSTANTS) -> float:
    """Convert a natural-unit length (1/eV) back to nm."""
    if not length_inv_eV > 0.0:
        raise DomainError(f"length must be positive, got {length_inv_eV!r} /eV")
    return length_inv_eV * constants.hbar_c_eV_nm


def speed_from_kinetic(kinetic_eV: float, mass_eV: float) -> float:
    """Non-relativistic speed v = sqrt(2K/m) as a fraction of c.

    The analysis behind this package assumes slow motion; speeds at or above
    c are rejected rather than silently clipped.
    """
    if kinetic_eV < 0.0:
        raise DomainError(f"kinetic energy must be non-negative, got {kinetic_eV!r} eV")
    if not mass_eV > 0.0:
        raise DomainError(f"mass must be positive, got {mass_eV!r} eV")
    v = math.sqrt(2.0 * kinetic_eV / mass_eV)
    if v >= 1.0:
        raise DomainError(
            f"speed {v:.6g} >= 1: the non-relativistic formula v = sqrt(2K/m) is invalid here"
        )
    return v


def kinetic_from_speed(speed: float, mass_eV: float) -> float:
    """Kinetic energy K = m v^2 / 2 in eV for a dimensionless speed."""
    if not 0.0 <= speed < 1.0:
        raise DomainError(f"speed must lie in [0, 1), got {speed!r}")
    if not mass_eV > 0.0:
        raise DomainError(f"mass must be positive, got {mass_eV!r} eV")
    return 0.5 * mass_eV * speed * speed


def charge_natural(charge_e: float, constants: Constants = CONSTANTS) -> float:
    """Charge in natural units for a charge given in elementary-charge units."""
    return charge_e * constants.elementary_charge_natural
