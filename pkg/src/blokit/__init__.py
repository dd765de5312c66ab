"""Block logic operation (BLO) template transform and its cryptanalysis.

The transform maps each odd-length block of a binary feature vector to a
one-bit-shorter block by XORing every bit with the middle bit and
dropping it.  This package implements the transform, the constructive
preimage attack that defeats it, and measurement studies of its fiber
structure, linkability, and revocability, all reproducible from seeds.
"""

from .analysis import (
    AnalysisReport,
    census_fibers,
    fiber_census,
    linkability_study,
    recovery_probability,
    revocability_check,
)
from .attack import (
    PreimageCount,
    PreimageTable,
    build_table,
    count_preimages,
    enumerate_preimages,
    forge,
    invert_block,
)
from .bits import (
    BitString,
    FeatureVector,
    complement,
    from_text,
    hamming_distance,
    pack,
    random_bits,
    read_feature,
    stream_rng,
    to_text,
    unpack,
    write_feature,
)
from .errors import (
    BlokitError,
    CapacityError,
    DimensionError,
    IncomparableTemplatesError,
    InvalidArgumentError,
    MalformedInputError,
    ManifestError,
    RecordNotFoundError,
    StorageError,
)
from .matcher import MatchDecision, match_templates
from .store import EnrollmentRecord, ManifestEntry, TemplateStore
from .transform import (
    PaddingPolicy,
    ProtectedTemplate,
    TransformParams,
    read_template_file,
    segment,
    transform,
    transform_block,
    write_template_file,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BitString",
    "BlokitError",
    "CapacityError",
    "DimensionError",
    "EnrollmentRecord",
    "FeatureVector",
    "IncomparableTemplatesError",
    "InvalidArgumentError",
    "MalformedInputError",
    "ManifestError",
    "MatchDecision",
    "PaddingPolicy",
    "PreimageCount",
    "PreimageTable",
    "ProtectedTemplate",
    "RecordNotFoundError",
    "StorageError",
    "TemplateStore",
    "TransformParams",
    "build_table",
    "census_fibers",
    "complement",
    "count_preimages",
    "enumerate_preimages",
    "fiber_census",
    "forge",
    "from_text",
    "hamming_distance",
    "invert_block",
    "linkability_study",
    "match_templates",
    "pack",
    "random_bits",
    "read_feature",
    "read_template_file",
    "recovery_probability",
    "revocability_check",
    "segment",
    "stream_rng",
    "to_text",
    "transform",
    "transform_block",
    "unpack",
    "write_feature",
    "write_template_file",
]
