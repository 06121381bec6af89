import dataclasses
import enum
import typing


class Predicate(enum.Enum):
    """The inequalities each stage is checked against"""

    P1 = "P1"  # the zero set of p_n is the graph of the branches of g_n
    P2 = "P2"  # sublevel sets are nested
    C1 = "C1"  # the new branches lie deep inside the previous sublevel set
    C2 = "C2"  # each new term is a tenth of the previous one
    XXX = "XXX"  # branch separation dominates the new term
    ES4 = "ES4"  # lower bound for the potential term off the previous sublevel set
    ES1 = "ES1"  # upper bound for the potential term on the sublevel set
    ES11 = "ES11"  # sublevel points lie near a root
    LEV1 = "LEV1"  # eps_n^(1/2^n) decreases


@dataclasses.dataclass(frozen=True)
class VerificationReport(object):
    """The outcome of checking one predicate at one stage

    Params:
        predicate: Predicate
        stage: int
        worst_margin: float
            The smallest margin seen; the predicate holds at a sample when its margin is >= 0
        worst_point: (complex, complex)
            The (z, w) sample where worst_margin was seen
        samples: int
            How many samples were checked
    """

    predicate: Predicate
    stage: int
    worst_margin: float
    worst_point: typing.Tuple[complex, complex]
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.worst_margin >= 0

    def to_dict(self) -> typing.Dict[str, typing.Any]:
        return {
            "predicate": self.predicate.value,
            "stage": self.stage,
            "worst_margin": self.worst_margin,
            "worst_point": list(self.worst_point),
            "samples": self.samples,
        }

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        z, w = self.worst_point
        return (
            f"{self.predicate.value:<5} stage {self.stage}  {verdict}  margin {self.worst_margin:+.6g}"
            f"  at z={z:.6g}, w={w:.6g}  ({self.samples} samples)"
        )
