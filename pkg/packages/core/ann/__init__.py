from .embedding import ann_to_system_model, system_model_to_ann
from .learning import learn
from .network import NeuralNetwork, feed_forward_network, ring_threshold_network
from .propagation import forward

__all__ = [
    "ann_to_system_model",
    "system_model_to_ann",
    "learn",
    "NeuralNetwork",
    "feed_forward_network",
    "ring_threshold_network",
    "forward",
]
