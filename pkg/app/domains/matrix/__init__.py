"""Matrix domain - Schatten norms, diamond products and pinching."""
