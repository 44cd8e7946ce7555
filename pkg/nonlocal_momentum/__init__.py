from .Domain import Domain, Side
from .BoundaryPhase import BoundaryPhase
from .SpectralPoint import SpectralPoint
from .Parameters import Parameters
from .Quadrature import Quadrature, QuadratureRule, QuadratureSpec
from .RootFinder import Bracket, RootFinder
from .Potential import Potential, PotentialForm
from .ComplexFunction import ComplexFunction
from .EigenResult import EigenResult, Rejection
from .GreenFunction import FreeAxisGreen, IntervalGreen, PointGreen
from .GammaMatrix import GammaMatrix, GammaVariant
from .NonlocalOperator import NonlocalOperator, SolverIntermediates
from .KernelModel import KernelModel
from .Resolvent import Resolvent
from .AxisSpectrum import AxisSpectrum
from .IntervalSpectrum import IntervalSpectrum
from .DiscreteOperator import DiscreteOperator
from .Timer import Timer
from .Verifier import Verifier
