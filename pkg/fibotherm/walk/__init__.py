from .matrix import row_moments
from .matrix import stationary_vector
from .matrix import transition_matrix
from .matrix import transition_rows
from .statistics import build_walk_model
from .statistics import classify
from .statistics import classify_grid
from .statistics import closed_form_stationary
from .statistics import conditional_second_moment
from .statistics import drift
from .statistics import GOLDEN_MEAN
from .statistics import log_drift
from .statistics import second_moment
from .statistics import tail_expectation
from .statistics import tail_ratio
