"""Group laws on conics over Z_N, Redei functions, and an RSA-like scheme on the Pell conic."""

from .engines import direct_power, modified_more_power, more_power, naive_power
from .geometry import Central, Parabola, ProjectivePoint, brahmagupta, geometric_product
from .params import INF, Finite, ParabolaSlope, RedeiNorm, SlopeGeneralEll, SlopeSquareEll, compose
from .redei import redei_rational
from .residue import Modulus, NonInvertible, Residue
from .rsa import decrypt, encrypt, keygen

__version__ = "0.1.0"
