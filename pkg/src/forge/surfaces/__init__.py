"""Builders, metric bundles and singular sets for the five surface classes."""

from .affine import (AffineMetrics, ImproperAffineData, ImproperAffineMap, affine_chain_check,
                     build_improper_affine, improper_affine_metrics, verify_affine_conditions)
from .cmc1 import (Cmc1Data, Cmc1Metrics, cmc1_elliptic_check, cmc1_identity_check,
                   cmc1_metric_bundle, cmc1_parabolic_g, cmc1_parabolic_model,
                   hopf_and_schwarzian_identity, swap_gauss_map)
from .flat_s3 import (FlatS3Data, FlatS3Forms, S3Mesh, compatibility_residual, constant_profile,
                      counterexample, flat_s3_forms, flat_s3_integrate, flatness_checks,
                      mesh_metric_error)
from .flatfront import (FlatFrontData, FrontMetric, exchange_roles, flat_front_bound_check,
                        flat_front_metrics, require_immersion)
from .maxface import (Maxface, MaxfaceData, build_maxface, induced_metric, maxface_ds2,
                      maxface_sigma_metric, nullity_residual, p_L)
from .model import KINDS, SurfaceModel, governing_forms, model_mesh, model_metrics, write_obj
from .singular import SingularCurve, extract_zero_set, singular_set_extract
