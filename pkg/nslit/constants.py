"""Physical constants in SI units, the single source for every module."""

import math

# exact since the 2019 SI redefinition
PLANCK = 6.62607015e-34
BOLTZMANN = 1.380649e-23

# h/2pi agrees with the CODATA value 1.054571817e-34 J s to all printed digits,
# deriving it keeps hbar*k_z/m and h/(m*lambda) consistent to rounding
HBAR = PLANCK / (2 * math.pi)

NEUTRON_MASS = 1.67492749804e-27

MASS_ALIASES = {
    'neutron': NEUTRON_MASS,
}

# grids and trajectories start this fraction of the Talbot length behind the grating
Z_MIN_FRACTION = 1 / 1000
