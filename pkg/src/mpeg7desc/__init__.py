"""MPEG-7 Colour Layout and Edge Histogram descriptors for large image corpora."""

from .cld import CldWeights, cld_distance, extract_cld
from .descriptor_io import (
    DescriptorRecord,
    Kind,
    SynsetFile,
    format_line,
    parse_line,
    read_synset_file,
    write_synset_file,
)
from .ehd import EdgeType, ehd_distance, extract_ehd
from .errors import (
    DecodeError,
    DimensionMismatch,
    DuplicateId,
    ExtensionError,
    ImageTooSmall,
    InvalidRecord,
    KindMismatch,
    LengthMismatch,
    ParseError,
)
from .imaging import RawImage, load_image, rgb_to_ycbcr
from .search import build_index, knn_query

__version__ = "0.1.0"
