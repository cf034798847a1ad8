"""Compressive-sensing face recognition: TV reconstruction from DCT
measurements, HOG features and one-versus-one linear SVMs."""
from .dataset_io import Gallery, LabeledImage, SplitSpec, load_gallery, load_manifest, read_pgm, split_gallery, write_pgm
from .experiment import ExperimentConfig, RunReport, export_reconstructions, run
from .hog import HogConfig, feature_dim, hog
from .metrics import PsnrReport, psnr
from .sampling import Measurements, SamplingMask, build_mask, embed, measure
from .svm import OvoModel, TrainConfig, predict, train_binary, train_ovo
from .transform import dct2, idct2
from .tv import SolverConfig, gradient_field, reconstruct, smoothed_tv_and_gradient, total_variation

__version__ = "0.1.0"
