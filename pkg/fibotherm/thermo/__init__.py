from .constants import check_parameters
from .constants import dimension_report
from .constants import hyperbolic_dimension
from .constants import LAMBDA_STAR
from .constants import log_pressure_factors
from .constants import pressure_bounds
from .constants import t1
from .constants import t2
from .constants import thermo_constants
from .equilibrium import equilibrium_data
from .equilibrium import lambda_profile
from .equilibrium import left_derivative_probe
from .equilibrium import normalising_constant
from .equilibrium import pressure_identity_residual
from .equilibrium import project_measures
from .equilibrium import transition_matrix_g
from .measures import closed_form_measures
from .measures import closed_form_normalising_constant
from .measures import conformal_masses
from .measures import invariant_masses
from .pressure import pressure_curve
from .pressure import pressure_or_status
from .pressure import solve_pressure
from .pressure import transition_scaling
from .recurrence import classify_recurrence
from .recurrence import gurevich_diagnostic
from .weights import closed_form_weights_p0
from .weights import conformal_weights
from .weights import decay_profile
from .weights import first_negative
from .weights import k0_asymptotic
from .weights import k0_estimate
from .weights import root_case
from .weights import to_decimal
from .weights import uk_recursion
