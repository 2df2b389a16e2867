"""Word metrics on Cayley graphs, exact isoperimetric area certificates,
and a finite-sample quasimetric/doubling/boundary analysis lab."""

__version__ = "0.1.0"

from .words import (  # noqa: F401
    Alphabet,
    Word,
    EMPTY,
    parse_word,
    serialize,
    word_length,
    free_reduce,
    invert,
    concat,
    conjugate,
    power,
)
from .presentations import (  # noqa: F401
    Presentation,
    Verdict,
    TrivialityOracle,
    FreeReductionOracle,
    ExponentSumOracle,
    BoundedRewriteOracle,
    presentation,
    validate_presentation,
    load_presentation,
    choose_oracle,
)
from .cayley import (  # noqa: F401
    CayleyBall,
    build_ball,
    is_path,
    distance,
    check_left_invariance,
    compare_generating_sets,
)
from .isoperimetry import (  # noqa: F401
    Factor,
    RelatorProduct,
    AreaCertificate,
    SearchBudget,
    ScanReport,
    evaluate_product,
    product_cost,
    area,
    hyperbolicity_scan,
)
