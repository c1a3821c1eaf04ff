"""graphstitch: synthesize a large graph from a single observed one.

The pipeline samples small node-ID-labeled subgraphs from the observation,
trains a discrete denoising diffusion model over them, then generates
subgraphs and unions their edges back into one synthetic graph whose
structure and link-prediction utility can be compared to the original.
"""

from .assembly import SynthAccumulator, assemble, generate_subgraph, progressive_assemble
from .denoiser import DenoiserParams, TrainConfig, grad, loss, predict, train
from .diffusion import (NoiseSchedule, NoisySample, build_schedule, forward_noise,
                        posterior_step, prior_sample, reverse_step, transition_apply)
from .errors import (ConfigError, DegenerateDegrees, DegeneratePosterior,
                     InvalidNodeSet, InvalidParameter, NegativeSamplingExhausted,
                     ParseError, StalledAssembly)
from .graphs import (Graph, graph_summary, induced_subgraph,
                     largest_connected_component, load_edge_list,
                     load_edge_list_file, save_edge_list)
from .linkpred import (EmbeddingModel, EvalSet, build_eval_set, evaluate,
                       train_link_predictor)
from .metrics import (StatsReport, characteristic_path_length, count_squares,
                      count_triangles, degree_stats, power_law_exponent,
                      stats_report)
from .pipeline import PipelineConfig, load_config
from .sampling import (SampleCorpus, SubgraphSample, build_corpus,
                       required_sample_count, sample_ego, sample_random_walk,
                       sample_uniform)
from .sbm import sbm_graph

__version__ = "0.1.0"
