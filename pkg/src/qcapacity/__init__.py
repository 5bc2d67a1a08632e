"""Classical and quantum capacities of photon signalling schemes."""

__version__ = "0.1.0"

from .dmc import Dmc, blahut_arimoto, mutual_information  # noqa: E402,F401
from .holevo import holevo_chi, maximize_holevo  # noqa: E402,F401
from .receivers import Povm, SignalSet, measure_channel  # noqa: E402,F401

__all__ = [
    "Dmc", "Povm", "SignalSet", "blahut_arimoto", "holevo_chi",
    "maximize_holevo", "measure_channel", "mutual_information",
]
