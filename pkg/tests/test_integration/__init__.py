# Integration tests for the epscalc CLI and cross-module results
