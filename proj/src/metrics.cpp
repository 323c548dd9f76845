namespace evolop {}
