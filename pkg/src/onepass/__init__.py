"""One-pass error detection and tolerant testing for Reed-Solomon style codes."""
