"""q-series package - q-Pochhammer symbols, q-binomials, basic hypergeometric series"""
