from .construction import branch_table
from .construction import build
from .construction import fibonacci_family
from .construction import power_law_family
from .construction import verify_conditions
from .evaluation import branch_info
from .evaluation import branch_orientation
from .evaluation import critical_derivative_check
from .evaluation import critical_orbit
from .evaluation import critical_order
from .evaluation import eval_F_iterate
from .evaluation import eval_F_linear
from .evaluation import eval_f
from .evaluation import evaluate_point
from .evaluation import iterate_f
from .evaluation import locate
from .evaluation import required_precision
from .factor import eval_T
from .factor import eval_T_reflected
from .factor import project_to_factor
from .factor import semiconjugacy_defect
