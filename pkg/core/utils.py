from faker import Faker

# Project
import config


def generate_trace_phrase() -> str:
    """
    Human-friendly phrase attached to a failed CLI run, both in the log and on stderr,
    so a user can quote it when reporting the problem. Not guaranteed unique.
    """
    faker = Faker()
    adjective = faker.word(part_of_speech="adjective")
    noun = faker.word(part_of_speech="noun")
    verb = faker.word(part_of_speech="verb")
    object_ = faker.word(part_of_speech="noun")
    return f"{adjective} {noun} {verb} {object_}"


def tolerance(reference: float, rtol: float = None, atol: float = None) -> float:
    """Dead band around `reference`: rtol * max(1, |reference|), never below atol."""
    rtol = config.RELATIVE_TOLERANCE if rtol is None else rtol
    atol = config.ABSOLUTE_TOLERANCE if atol is None else atol
    return max(rtol * max(1.0, abs(reference)), atol)


def is_close(lhs: float, rhs: float, rtol: float = None, atol: float = None) -> bool:
    return abs(lhs - rhs) <= tolerance(rhs, rtol, atol)
