"""Dataset preparation: load, impute, balance, normalize, tokenize, split."""
