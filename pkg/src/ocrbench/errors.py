"""Exception types raised by the benchmarking harness."""


class OcrBenchError(Exception):
    """Base class for all harness errors."""


class MalformedFilename(OcrBenchError):
    """Image filename does not follow the dataset naming grammar."""


class MissingColumn(OcrBenchError):
    """A required CSV header column is absent."""


class DuplicateImage(OcrBenchError):
    """Duplicate image filename (or image/field pair) in one input file."""


class MalformedRow(OcrBenchError):
    """CSV row with wrong arity or unparseable values."""


class UnknownFieldType(OcrBenchError):
    """field/text type value outside {ingredients, nfp}."""


class EmptyGroundTruth(OcrBenchError):
    """Ground-truth text is blank after trimming."""


class EmptyNeedle(OcrBenchError):
    """partial_ratio called with an empty needle."""


class EmptyReference(OcrBenchError):
    """A metric was asked to score against an empty reference."""


class FieldMismatch(OcrBenchError):
    """Prediction and ground truth disagree on image or field type."""


class EmptyInput(OcrBenchError):
    """An aggregate was requested over an empty collection."""


class NoProductsWithField(OcrBenchError):
    """Field-level coverage has a zero denominator."""


class MissingTiming(OcrBenchError):
    """Timing aggregation over records without time_seconds."""


class AdapterFailure(OcrBenchError):
    """External OCR adapter exited non-zero."""


class IoFailure(OcrBenchError):
    """Output file could not be written."""
