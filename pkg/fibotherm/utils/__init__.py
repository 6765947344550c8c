from . import click
from . import functions
from . import helpers
from . import io
from . import log
