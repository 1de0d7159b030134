"""Spontaneous emission, spin-down and radiation forces of rotating bodies.

A scattering-matrix trace gives the power a slowly rotating lossy body
radiates into the vacuum; the same channel amplitudes drive the torque and
tangential force it exerts on nearby test objects and its own spin-down.
"""

from .constants import C, HBAR, K_B
from .dynamics import (
    BodySpec,
    SpinDownScenario,
    SpinDownTrajectory,
    integrate_spin_down,
    spin_down_timescale,
)
from .errors import (
    ChannelFileError,
    ConfigError,
    DomainError,
    PathConsistencyError,
    PoleError,
    QuadratureAccuracyError,
    RegimeError,
    SingularityError,
    SpinradError,
    StiffnessError,
    TabulationRangeError,
    UnsupportedChannelError,
)
from .interactions import (
    InteractionResult,
    TestObject,
    radiation_interaction,
    shear_force_on_test,
    stress_element,
    test_S_11E,
    torque_on_test,
    translation_coefficients,
)
from .materials import (
    ConstantLoss,
    Drude,
    LinearLossToy,
    Lorentz,
    TabulatedDielectric,
    Vacuum,
    cylinder_surface_factor,
    epsilon,
    load_tabulated_dielectric,
    sphere_polarizability,
)
from .radiation import (
    ChannelSpectrum,
    QuadratureConfig,
    RadiationResult,
    SphereChannels,
    TruncationReport,
    photon_spectrum,
    power_cylinder,
    power_sphere,
    static_radiation,
    trace_power,
)
from .scattering import (
    ChannelId,
    SMatrixBlock,
    TabulatedChannel,
    TabulatedChannelSet,
    cylinder_T_block,
    deficiency,
    dump_tabulated_channels,
    load_tabulated_channels,
    sphere_S_11E,
    sphere_S_general,
)
from .thermal import ThermalState, bose_occupation, occupation_difference, thermal_weight
from .waves import (
    FieldSample,
    WaveIndex,
    flux_bracket,
    outgoing_wave,
    outgoing_wave_fields,
    spherical_bessel_j,
    spherical_bessel_y,
    spherical_hankel1,
    spherical_hankel1_deriv,
)

__version__ = "0.1.0"
