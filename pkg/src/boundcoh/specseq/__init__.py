from .bicomplex import (Bicomplex, Page, PageEntry, compute_pages, e_infinity, random_bicomplex,
                        stable_page_index, total_cohomology, validate)
from .ledger import BettiTable, LedgerAmbiguity, LedgerResult, ledger_solve, theorem_dims

__all__ = [
    "Bicomplex", "Page", "PageEntry", "compute_pages", "e_infinity", "random_bicomplex",
    "stable_page_index", "total_cohomology", "validate",
    "BettiTable", "LedgerAmbiguity", "LedgerResult", "ledger_solve", "theorem_dims",
]
