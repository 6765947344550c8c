from .orbits import branch_histogram
from .orbits import orbit_escape_fraction
from .orbits import random_starts
from .orbits import simulate_orbit
from .orbits import transition_frequency_test
from .walkers import simulate_walk
