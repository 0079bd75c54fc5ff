"""Transmit power allocation for wireless and radar network localization."""
from .errors import (ConfigError, DegenerateGeometryError, DimensionError, DomainError,
                     InfeasibleBaselineError, LocPowerError, ValidityError)
from .netmodel import (PowerAllocation, RadarNetwork, WirelessNetwork, erc_rnl, erc_wnl, geometry,
                       network_from_angles, uniform_angle_network)
from .fisher import (Efim, SpebScene, direction_matrix, efim_rnl, efim_wnl, speb, speb_fractional,
                     speb_of, topology_matrix)
from .allocate import (PriorInfo, build_min_power, build_min_power_prior_wnl, build_min_power_rnl,
                       build_min_power_wnl, build_minmax_wnl, solve_allocation, uniform_min_power)

__version__ = "0.1.0"
