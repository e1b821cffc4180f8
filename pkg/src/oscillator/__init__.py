"""Oscillator package - model parameters, wavefunctions, spectrum"""
