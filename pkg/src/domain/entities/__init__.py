# Domain entities - Core simulation objects
