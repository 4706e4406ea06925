"""Subspace appearance models, occlusion competition and species tracking."""
from .appearance import AppearanceModel, masked_residual, observation_likelihood, selective_update
from .competition import (CompetitionResult, Overlap, box_of, compete, competition, detect_overlap,
                          localize, overlap_of, patch_mask, repulsion_force, snap_center)
from .species import (FrameDiagnostics, Species, Status, TrackerConfig, declared_occlusions,
                      init_species, repulsion_step, restart, species_rng, track_frame)

__all__ = [
    "AppearanceModel", "masked_residual", "observation_likelihood", "selective_update",
    "CompetitionResult", "Overlap", "box_of", "compete", "competition", "detect_overlap",
    "localize", "overlap_of", "patch_mask", "repulsion_force", "snap_center",
    "FrameDiagnostics", "Species", "Status", "TrackerConfig", "declared_occlusions",
    "init_species", "repulsion_step", "restart", "species_rng", "track_frame",
]
