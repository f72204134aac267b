"""Monte Carlo evaluation of the surface-code fidelity threshold under
bath-induced correlated errors."""

from .lattice import (LatticeGeometry, NeighborTable, SyndromeSpec, SyndromeString,
                      build_lattice, neighbor_table, syndrome_string)
from .hamiltonian import (CouplingSet, OhmicParameters, couplings_from_ohmic,
                          delta_energy, ohmic_beta, ohmic_coupling, total_energy)
from .state import (SpinConfiguration, flip_line, flip_plaquette, string_value,
                    vacuum, validate_stars)
from .sampler import (Accumulator, SampleStats, SamplerConfig, estimate, run_chain,
                      sweep)
from .analysis import (ObservablePoint, ScalingFit, crossing_beta, fidelity_from_ratio,
                       fit_beta_c, heat_capacity, peak_beta, ratio_BA)

__version__ = "0.1.0"
