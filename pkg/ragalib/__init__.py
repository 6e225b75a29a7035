"""Autoregressive network and Markov-chain models of raga note sequences."""
