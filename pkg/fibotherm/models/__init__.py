from . import base
from . import config
from . import event
from . import kneading
from . import plmap
from . import simulation
from . import thermo
from . import verify
from . import walk
