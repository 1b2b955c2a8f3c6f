"""Certifying graph-minor algorithms: every output carries a re-checkable witness."""

from .bipartite import SmallDenseCert, bipartite_increment, find_unmated_violation
from .builder import (Gates, PipelineResult, assemble_clique_minor, color_or_minor, dense_minor_min_degree,
                      find_clique_minor, mader_subgraph)
from .certificates import dumps, to_cert, verify, verify_data, verify_text
from .coloring import Coloring, independent_or_minor, log_partition_color, woodall_split
from .errors import *  # noqa: F401,F403
from .generators import gen, pg_incidence
from .graph import ContractionMap, Graph
from .increment import choose_params, dense_or_minor, general_increment, small_or_dense_minor
from .linkage import LinkageSpec, find_linkage, knitted_cover, rooted_model_with_linkage
from .models import Model, find_clique_model, hadwiger_number, max_minor_density, validate_model
from .turan import choose_delta, subgraph_free, turan_experiment
