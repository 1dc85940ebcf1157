namespace mdam {}
