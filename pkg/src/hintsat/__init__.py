"""hintsat: a saturation prover whose clause selection is guided by
watchlists mined from previous proofs."""

from .fol import Clause, Problem, alpha_normalize
from .harness import (greedy_cover, read_results, report, run_corpus,
                      run_one, write_results)
from .proofs import ProofRecord, check_proof, extract_watchlist
from .saturation import (RunStats, SaturationResult, evaluate, generate,
                         saturate)
from .selection import (KnnModel, ProofCorpusEntry, build_model,
                        build_watchlists, extract_features, knn_suggest,
                        load_corpus, mine_round2)
from .strategy import (BUILTIN_STRATEGIES, Strategy, apply_mode, get_strategy,
                       parse_strategy)
from .subsumption import WatchlistIndex, subsumes
from .tptp import parse_cnf, print_clause
from .watchlist import (MatchEvent, Watchlist, WatchlistGuidance,
                        load_watchlists, relevance0, relevance1, relevance2)

__version__ = "0.1.0"
