from .dataset import Dataset, first_derivative
from .csvfile import load_csv, save_csv, save_table, frame_to_text
from .modelfile import (FORMAT_VERSION, ModelFile, CollectionFile, config_hash, save_model, load_model,
                        save_collection, load_collection, save_tune, load_tune)
