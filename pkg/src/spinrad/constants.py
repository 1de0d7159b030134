"""Physical constants (CODATA 2018, SI units)."""

HBAR = 1.054571817e-34  # J s
C = 299792458.0         # m / s
K_B = 1.380649e-23      # J / K
