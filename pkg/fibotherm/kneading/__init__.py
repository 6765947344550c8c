from .kneading import check_admissibility
from .kneading import check_condition_121
from .kneading import fibonacci_kneading
from .kneading import floor_r_kneading
from .kneading import kneading_from_sequence
from .kneading import kneading_sides
