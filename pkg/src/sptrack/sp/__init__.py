"""Pattern alignment, compression scoring, coding and recognition."""
from .alignment import (Alignment, AlignmentError, Column, CompressionScore, bound_span,
                        check_alignment, format_block, format_grid, initial_alignment,
                        parse_block, score_alignment)
from .codec import CodecError, run_length_compress, run_length_decompress
from .cost import segmentation_cost
from .patterns import (OldStore, Origin, Pattern, PatternError, Symbol, as_new,
                       format_pattern, parse_patterns, read_symbols, symbols)
from .recognition import INFERRED, Recognition, recognize
from .search import build_multiple_alignment, pairwise_align

__all__ = [
    "Alignment", "AlignmentError", "Column", "CompressionScore", "bound_span",
    "check_alignment", "format_block", "format_grid", "initial_alignment", "parse_block",
    "score_alignment", "CodecError", "run_length_compress", "run_length_decompress",
    "segmentation_cost", "OldStore", "Origin", "Pattern", "PatternError", "Symbol",
    "as_new", "format_pattern", "parse_patterns", "read_symbols", "symbols",
    "INFERRED", "Recognition", "recognize", "build_multiple_alignment", "pairwise_align",
]
