from . import exceptions
from . import kneading
from . import models
from . import plmap
from . import simulation
from . import thermo
from . import utils
from . import walk
