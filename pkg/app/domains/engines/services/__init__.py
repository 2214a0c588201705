"""Engine services - decomposition searches, sup searches and witness families."""
