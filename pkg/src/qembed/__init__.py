"""Coded (Pseudo-Huffman) embeddings of non-reversible Boolean functions.

Typical use::

    from qembed import parse_tt, histogram, codebook_for, width_report

    f = parse_tt(open("f.tt").read())
    h = histogram(f)
    print(width_report(f, h))
"""
from .counting import Backend, CountBackend, count_cofactor, count_enumerate, tabulate
from .embedder import (
    EmbeddingSpec,
    Scheme,
    VerificationReport,
    WidthReport,
    dump_embedding,
    embed,
    embed_bennett,
    embed_coded,
    embed_minimal,
    load_embedding,
    verify_embedding,
    width_bennett,
    width_encoded,
    width_minimal,
    width_report,
)
from .errors import *  # noqa: F401,F403
from .function import (
    BitPattern,
    BooleanFunction,
    Cube,
    OutputHistogram,
    ceil_log2,
    evaluate,
    histogram,
)
from .phcoder import (
    CodeBook,
    PhNode,
    PhTree,
    RootBound,
    assign_codes,
    build_ph_tree,
    codebook_for,
    render_dot,
    render_text,
    root_weight_bound,
    verify_theorem_instance,
)
from .pla_io import load_function, parse_pla, parse_tt, serialize_pla, serialize_tt
from .report import RunConfig, analyze_file, report_csv

__version__ = "0.1.0"
