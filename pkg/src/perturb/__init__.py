from .grid import (
    OP_TYPES,
    SEVERITIES,
    WORD_LEVEL_OPS,
    PairedCase,
    PerturbationConfig,
    PerturbationGrid,
    SkippedCase,
    apply_operator,
    build_perturbation_grid,
    grid_cells,
    make_case_id,
)
from .lexicon import SynonymLexicon, lexicon_from_wordnet, load_lexicon, save_lexicon
from .operators import (
    EditResult,
    char_delete,
    char_swap,
    edit_budget,
    permute_window,
    swap_adjacent,
    synonym_replace,
    word_delete,
    word_shuffle,
)
from .translate import DictionaryTranslator, HttpTranslator, IdentityTranslator, back_translate

__all__ = [
    "OP_TYPES",
    "SEVERITIES",
    "WORD_LEVEL_OPS",
    "DictionaryTranslator",
    "EditResult",
    "HttpTranslator",
    "IdentityTranslator",
    "PairedCase",
    "PerturbationConfig",
    "PerturbationGrid",
    "SkippedCase",
    "SynonymLexicon",
    "apply_operator",
    "back_translate",
    "build_perturbation_grid",
    "char_delete",
    "char_swap",
    "edit_budget",
    "grid_cells",
    "lexicon_from_wordnet",
    "load_lexicon",
    "make_case_id",
    "permute_window",
    "save_lexicon",
    "swap_adjacent",
    "synonym_replace",
    "word_delete",
    "word_shuffle",
]
