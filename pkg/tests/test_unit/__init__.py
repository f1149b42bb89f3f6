# Unit tests for epscalc components
