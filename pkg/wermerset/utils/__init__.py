# flake8: noqa
from wermerset.utils import algebra, analysis, branches, construction, converters, errors, grid_export, serialization
from wermerset.utils.algebra import BiPoly, RootSet, UniPoly
from wermerset.utils.branches import BranchPointTable, FibreFrame, SignVector, StageFunctionSet
from wermerset.utils.construction import Construction, GridConfig, Predicate, Stage, VerificationReport
from wermerset.utils.runner import Runner
from wermerset.utils.custom_command import Command
