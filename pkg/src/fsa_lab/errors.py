"""Error classes shared by the library and the command line.

The CLI maps each class to a fixed exit code: parse errors exit 2,
contract violations exit 3 and guardrail refusals exit 4.
"""


class FsaLabError(Exception):
    exit_code = 1


class ParseError(FsaLabError):
    """Malformed file, flag or machine description."""

    exit_code = 2


class ContractError(FsaLabError):
    """A precondition of an operation does not hold."""

    exit_code = 3


class InputValidationError(ContractError):
    """A word contains a letter outside the declared alphabet."""


class UnsupportedSemanticsError(ContractError):
    """The circuit uses a construct the monotone settling model cannot time."""


class PipelineContractError(ContractError):
    """A pass produced a letter the next pass cannot read."""


class GuardrailError(FsaLabError):
    """A desk-scale size cap was exceeded."""

    exit_code = 4

    def __init__(self, message: str, cap: int):
        super().__init__(f"{message} (cap {cap})")
        self.cap = cap
