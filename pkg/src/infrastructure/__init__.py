# Infrastructure layer - External concerns and implementations 