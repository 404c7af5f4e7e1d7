"""Consistency, enumeration and optimal relaxation of feature subscriptions."""
from .bnb import SolverConfig, SearchStats, solve
from .enumeration import OrderPair, get_solutions, linear_extensions, rank_pairs
from .instances import (CatalogueSpec, Instance, SubscriptionSpec, gen_catalogue, gen_subscription,
                        parse_fsp, read_fsp, write_fsp)
from .model import (AntiSubscription, BiRegionCatalogue, BiRegionSubscription, Catalogue,
                    InconsistentError, MalformedError, Region, Relaxation, Subscription,
                    anti_subscription, complete, is_consistent, partial_completion, reformulate,
                    transitive_closure, value_of, verify_relaxation)
from .oracle import brute_force_optimal

__version__ = "0.1.0"
