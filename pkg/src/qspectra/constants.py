"""Physical constants in SI units.

Every frequency in this package is an angular frequency in rad/s, energies
are joules, magnetic flux is webers.  The constants below are the CODATA
2018 values (exact where the SI defines them so).
"""

HBAR = 1.054571817e-34  # reduced Planck constant, J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C (exact)
FLUX_QUANTUM = 2.067833848e-15  # Wb, h/(2e)
BOLTZMANN = 1.380649e-23  # J/K (exact)

__all__ = ["HBAR", "ELEMENTARY_CHARGE", "FLUX_QUANTUM", "BOLTZMANN"]
