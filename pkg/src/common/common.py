#! /usr/bin/env python3


# default tolerances shared across modules
EPS_REG = 1e-12
EPS_AXIS = 1e-9
DELTA_POS = 1e-9


class TreadmillNumericError(Exception):
    """
    Base class for numeric failures; the command line maps all of them to exit
        status 3
    """


class RegularityViolation(TreadmillNumericError):
    pass


class UnwrapFailure(TreadmillNumericError):
    pass


class NotATreadmillSled(TreadmillNumericError):
    pass


class RangeViolation(TreadmillNumericError):
    pass


class ConstantCurve(TreadmillNumericError):
    pass


class DegenerateMetric(TreadmillNumericError):
    pass


class EmptyLevelSet(TreadmillNumericError):
    pass


def provide_error_messages() -> dict[str, str]:
    """
    Defines diagnostic messages for numeric failures
    Defined in a function separate from the raising code so that the messages
        can be easily used in unit tests in accordance with DRY
    """

    error_messages = {
        'regularity': (
            'Curve is not regular:  tangent norm {norm:.3e} at sample {idx} '
            'is not above {eps:.1e}.'),
        'unwrap': (
            'Sampling too coarse to unwrap the turning angle:  consecutive '
            'tangents differ by {delta:.3f} radians at sample {idx}.'),
        'not_ts': (
            'Curve is not a TreadmillSled:  w\' = {w_prime:.3e} does not '
            'vanish where z = 0 (sample {idx}).'),
        'range': (
            'Range violation:  w f - z\' has minimum {minimum:.3e}, which is '
            'not above {delta:.1e}.'),
        'constant': (
            'Curve is constant (total variation {variation:.3e}); the '
            'companion function f is not determined, supply it explicitly.'),
        'degenerate': (
            'Degenerate metric:  EG - F^2 = {det:.3e} at interior node '
            '{node}.'),
        'empty_level_set': (
            'No real branch of the level set could be traced:  {reason}.'),
        }

    return error_messages


def seconds_to_formatted_time_string(seconds: float) -> str:
    """
    Given the number of seconds, returns a formatted string showing the time
        duration
    """

    hour = int(seconds / (60 * 60))
    minute = int((seconds % (60 * 60)) / 60)
    second = seconds % 60

    return '{}:{:>02}:{:>05.2f}'.format(hour, minute, second)
