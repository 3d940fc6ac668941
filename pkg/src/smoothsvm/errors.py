"""Exception hierarchy.

Everything raised for bad user input derives from :class:`InputError`, which
the command line maps to exit status 2.
"""


class SmoothSVMError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SmoothSVMError, ValueError):
    """Malformed or inconsistent input data / parameters."""


class EmptyDataset(InputError):
    pass


class LabelOutOfRange(InputError):
    pass


class ZeroRow(InputError):
    def __init__(self, row):
        self.row = row
        super().__init__(
            f"sample {row} is all zeros; its infinity norm appears in a "
            "denominator. Remove or deduplicate the row before training.")


class DimensionMismatch(InputError):
    pass


class NonPositiveKernelWidth(InputError):
    pass


class MissingNu(InputError):
    pass


class MalformedLine(InputError):
    def __init__(self, line_no, detail=""):
        self.line_no = line_no
        msg = f"line {line_no}: malformed record"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class NonMonotonicIndex(InputError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(f"line {line_no}: feature indices must be strictly increasing")


class UnmappableLabel(InputError):
    def __init__(self, line_no, label):
        self.line_no = line_no
        self.label = label
        super().__init__(
            f"line {line_no}: label {label!r} is not one of -1, 0, +1, 1")


class TooFewSamples(InputError):
    pass


class NonFiniteIterate(SmoothSVMError, FloatingPointError):
    """The iterate blew up; usually a Lipschitz constant that is too small."""


class NonFiniteEvaluation(SmoothSVMError, FloatingPointError):
    pass


class SingularSystem(SmoothSVMError, ArithmeticError):
    pass
