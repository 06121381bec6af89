import typing

from wermerset.utils.errors import CommandUsageError


def _numbers(argument: str, text: str, count: int, expected: str) -> typing.List[float]:
    parts = [part.strip() for part in str(text).split(",")]
    if len(parts) != count:
        raise CommandUsageError(argument, text, expected)
    try:
        return [float(part) for part in parts]
    except ValueError:
        raise CommandUsageError(argument, text, expected)


def complex_pair(text: str) -> complex:
    """Reads "re,im" into a complex number"""

    re, im = _numbers("a point", text, 2, "two numbers as re,im")
    return complex(re, im)


def circle_triple(text: str) -> typing.Tuple[complex, float]:
    """Reads "re,im,r" into a centre and a positive radius"""

    re, im, radius = _numbers("a circle", text, 3, "three numbers as re,im,r")
    if not radius > 0:
        raise CommandUsageError("a circle", text, "a positive radius")
    return complex(re, im), radius


def window_spec(text: str) -> typing.Tuple[complex, float, int]:
    """Reads "re,im,half_width,count" into a square sampling window"""

    re, im, half_width, count = _numbers("a window", text, 4, "four numbers as re,im,half_width,count")
    if not half_width > 0 or count < 2 or count != int(count):
        raise CommandUsageError("a window", text, "a positive half width and a whole count of at least 2")
    return complex(re, im), half_width, int(count)


def stage_number(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise CommandUsageError("a stage", text, "a whole number")
    if value < 1:
        raise CommandUsageError("a stage", text, "a stage number of at least 1")
    return value


def segment_ends(text: str) -> typing.Tuple[complex, complex]:
    """Reads "re0,im0,re1,im1" into the two ends of a segment"""

    re0, im0, re1, im1 = _numbers("a segment", text, 4, "four numbers as re0,im0,re1,im1")
    return complex(re0, im0), complex(re1, im1)
