"""Verification suites and the conjecture search engine."""

from .report import ConjectureReport
from .search import SearchConfig, evaluate_instance, revalidate, search_conjecture
from .status import Status
from .verify import (verify_corollary, verify_lemma7, verify_lemma8, verify_thm11,
                     sign_suite, lemma8_suite)
